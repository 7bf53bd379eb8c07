import sys

from fracbs.cli import main

sys.exit(main())
