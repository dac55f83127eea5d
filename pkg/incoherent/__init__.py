__author__ = 'maintainers@incoherent-eisenstein.org'
__version__ = '1.0.0'
