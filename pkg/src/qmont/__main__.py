import sys

from qmont.cli import main

sys.exit(main())
