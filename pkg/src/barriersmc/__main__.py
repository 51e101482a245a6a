import sys

from barriersmc.cli import main

sys.exit(main())
