import sys

from netcoop.cli import main

sys.exit(main())
