import sys

from geobatch.cli import main

sys.exit(main())
