app_name = "gridrate"
__version__ = "0.1.0"
