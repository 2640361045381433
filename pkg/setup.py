from sys import version_info
from setuptools import setup, find_packages

from cyberemergence import __title__, __version__, __author__


# This is a Python 3 package only
if version_info.major != 3:
    print("This package will only work with Python 3. \n"
          "If you already have Python 3 installed try "
          "'pip3 install cyberemergence'.")

__desc__ = ("Spectral die-out thresholds, attack-defense dynamics and "
            "hyperproperty checks for composed cybersystems")
__author_email__ = "buidinhan@live.com"
__license__ = "BSD"
__url__ = "https://github.com/buidinhan/cyberemergence"
__requires__ = ["numpy>=1.17.0",
                "pandas>=1.5.0",
                "matplotlib>=3.1.1",
                "scipy>=1.3.1",
                "statsmodels>=0.10.1",
                "networkx>=2.4",
                "loguru>=0.5.0",
]
__extras_require__= {
        'notebooks':  ["jupyter"],
        'tests': ["pytest>=6.0"],
    }
__python_requires__ = ">=3.8"
__keywords__ = [
    "cybersecurity",
    "epidemic threshold",
    "spectral radius",
    "emergent behavior",
    "hyperproperties",
]
__classifiers__ = [
    "Development Status :: 3 - Alpha",
    "Programming Language :: Python :: 3",
    "Topic :: Scientific/Engineering",
    "Topic :: Security",
    "Intended Audience :: Science/Research",
    "License :: OSI Approved :: BSD License",
]

with open("README.md", encoding="utf-8") as f:
    __long_description__ = f.read()

setup(
    name=__title__,
    version=__version__,
    author=__author__,
    author_email=__author_email__,
    description=__desc__,
    long_description=__long_description__,
    long_description_content_type='text/markdown',
    license=__license__,
    keywords=__keywords__,
    url=__url__,
    packages=find_packages(exclude=["tests", "examples", "examples.*"]),
    classifiers=__classifiers__,
    install_requires=__requires__,
    extras_require = __extras_require__,
    python_requires=__python_requires__,
    entry_points={
        "console_scripts": ["cyberemergence=cyberemergence.cli:main"],
    },
)
