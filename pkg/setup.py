from setuptools import setup, find_packages

from codecs import open
from os import path

here = path.abspath(path.dirname(__file__))

with open(path.join(here, "README.org")) as f:
    long_desc = f.read()

with open(path.join(here, "requirements.txt")) as f:
    requirements = f.read().splitlines()

setup(
    name="zoprox",
    version="0.1.0",
    description="Zeroth-order proximal solvers, reductions and a query-counting benchmark harness",
    long_description=long_desc,
    author="ben simms",
    packages=find_packages(exclude=("examples", "tests")),
    install_requires=requirements,
    include_package_data=True,
    package_data={"zoprox.parser": ["libsvm.ebnf"]},
    entry_points={
        "console_scripts": [
            "zoprox=zoprox.bench.cli:cli"
        ]
    }
)
