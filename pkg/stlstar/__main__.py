import sys

from stlstar.cli import main

sys.exit(main())
