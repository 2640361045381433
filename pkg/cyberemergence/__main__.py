import sys

from cyberemergence.cli import main


sys.exit(main())
