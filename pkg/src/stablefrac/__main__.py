import sys

from stablefrac.cli import main

sys.exit(main())
