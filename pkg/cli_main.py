import sys

from dotenv import load_dotenv

# .env values must be in place before any config helper reads the environment
load_dotenv()

from cli_app import SpectralLabCLI  # noqa: E402
from helpers import LoggerHelper  # noqa: E402
from helpers.constants import EXIT_ERROR  # noqa: E402

# Initialize logger with module name and custom prefix
logger = LoggerHelper.get_logger(__name__, prefix='spectral-lab')


def main(argv=None) -> int:
    try:
        cli = SpectralLabCLI()
        logger.debug("CLI instance created", extra={'cli_class': type(cli).__name__})
        return cli.run(argv)

    except Exception as e:
        logger.exception("Fatal error in main execution")
        logger.error("Shutting down due to fatal error",
                     extra={'error_type': type(e).__name__, 'error_args': str(e.args)})
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
