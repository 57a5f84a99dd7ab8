import sys

from aoi_cli.app import main

sys.exit(main())
