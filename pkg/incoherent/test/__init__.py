__author__ = 'maintainers@incoherent-eisenstein.org'
