# Kept apart from __init__.py so that setup.py can read it without importing
# the package dependencies.
__version__ = '0.1.0'
