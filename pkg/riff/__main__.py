"""
Entry point for running riff as a module: python -m riff
"""

from riff.cli.main import main

if __name__ == "__main__":
    main()
