from setuptools import find_packages, setup


setup(
    # Basic package information:
    name = 'zero-ibvp',
    version = '0.1.0',
    packages = find_packages(),

    # Packaging options:
    zip_safe = False,
    include_package_data = True,
    package_data = {'ibvp': ['fixtures/*.json']},

    # Package dependencies:
    install_requires = ['Django>=3.1', 'numpy>=1.20', 'scipy>=1.7'],
    extras_require = {'test': ['pytest>=6.0']},
    python_requires = '>=3.7',

    # Command line:
    entry_points = {
        'console_scripts': ['ibvp = ibvp.cli:main'],
    },

    # Metadata for PyPI:
    author = 'Jose Maria Zambrana Arze',
    author_email = 'contact@josezambrana.com',
    license = 'apache license v2.0',
    url = 'http://github.com/mandlaweb/Zero-IBVP',
    keywords = 'zero conservation laws nonlocal lax-friedrichs',
    description = 'Lax-Friedrichs scheme for nonlocal conservation laws on bounded domains',
    long_description = "Finite volume solver with a priori bounds, entropy checks "
                       "and stability experiments for nonlocal balance laws with "
                       "boundary conditions."
)
