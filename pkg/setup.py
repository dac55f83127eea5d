from setuptools import setup, find_packages


def get_read_me():
    with open('readme.rst', 'r') as readme:
        return str(readme.read())


setup(
    name="incoherent-eisenstein",
    packages=find_packages(exclude=['examples', 'examples.*']),
    version="1.0.0",
    description="The weight one nonholomorphic form of an imaginary quadratic field, its Fourier coefficients and the "
                "arithmetic identities they satisfy",
    author="incoherent-eisenstein maintainers",
    author_email="maintainers@incoherent-eisenstein.org",
    long_description=get_read_me(),
    license='Apache Software License',
    classifiers=[
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Operating System :: OS Independent',
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',
        'License :: OSI Approved :: Apache Software License'
    ],
    install_requires=[
        'mpmath>=1.1',
        'sympy>=1.5',
        'numpy>=1.17',
    ],
    entry_points={
        'console_scripts': ['incoherent = incoherent.cli:main'],
    },
    test_suite='incoherent.test',
    setup_require=[
        'Sphinx'
    ],
)
