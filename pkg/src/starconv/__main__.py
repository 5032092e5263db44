import sys

from starconv.cli import main

sys.exit(main())
