import sys

from combwalk.cli import main

sys.exit(main())
