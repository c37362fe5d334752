import sys

from echo_imager.cli.main import main


sys.exit(main())
