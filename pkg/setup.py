from pathlib import Path

from setuptools import find_packages, setup


def read_requirements():
    """Runtime requirements from requirements.txt, test tooling excluded."""
    lines = Path(__file__).with_name("requirements.txt").read_text().splitlines()
    return [
        line.strip() for line in lines
        if line.strip() and not line.startswith("#") and not line.startswith("pytest")
    ]


setup(
    name="weakslit",
    version="1.0.0",
    description="Weak-value double-slit trajectories of option prices",
    long_description=Path(__file__).with_name("README.md").read_text(encoding="utf-8"),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=("tests", "tests.*", "examples", "examples.*")),
    python_requires=">=3.9",
    install_requires=read_requirements(),
    extras_require={"test": ["pytest==7.4.3"]},
    entry_points={"console_scripts": ["weakslit=weakslit.main:main"]},
)
