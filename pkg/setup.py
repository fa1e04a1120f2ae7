from setuptools import find_packages, setup

from salhi import __version__

setup(
    name="salhi",
    version=__version__,
    description="Modeling and gain optimization for the SU(1,1) atom-light hybrid interferometer",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.24,<2",
        "scipy>=1.10",
        "python-dotenv>=1.0",
        "tqdm>=4.66",
        "click>=8.1",
    ],
    extras_require={"test": ["pytest>=7.4", "hypothesis>=6.92"]},
    entry_points={"console_scripts": ["salhi = salhi.cli:main"]},
)
