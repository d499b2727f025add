"""Entry point for python -m kahler_circles"""

from kahler_circles.cli import app

if __name__ == "__main__":
    app()
