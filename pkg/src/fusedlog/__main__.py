import sys

from fusedlog.cli import main

sys.exit(main())
