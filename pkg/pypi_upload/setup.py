import os
import re
import sys
from pathlib import Path

from setuptools import find_packages, setup
from setuptools.command.install import install

project_root = Path(__file__).parents[1]


class VerifyCommand(install):
    """Check that the release tag names the packaged version"""

    description = "verify release tag"

    @staticmethod
    def verify_git_tag():
        tag = os.getenv("RELEASE_TAG")
        version = get_version()

        if tag != version:
            sys.exit(f"Release tag {tag} does not match the package version {version}")

    def run(self):
        self.verify_git_tag()


def get_version():
    init_contents = (project_root / "fpme_lab/__init__.py").read_text(encoding="utf-8")

    return re.search(r"^__version__ = ['\"]([^'\"]*)['\"]", init_contents, re.M).group(1)


def get_requirements():
    requirements = (project_root / "requirements.txt").read_text(encoding="utf-8")

    return list(filter(None, requirements.splitlines()))


def get_long_description():
    return (project_root / "README.md").read_text(encoding="utf-8")


setup(
    name="fpme_lab",
    version=get_version(),
    packages=find_packages(include=("fpme_lab", "fpme_lab.*")),
    package_data={"fpme_lab.harness": ["configs/*.ini"]},
    install_requires=get_requirements(),
    setup_requires=["wheel"],
    entry_points={"console_scripts": ["fpme-lab = fpme_lab.harness.cli:main"]},
    description="Simulation and numerics for the long-range porous-medium exclusion process",
    long_description=get_long_description(),
    long_description_content_type="text/markdown",
    license="MIT",
    classifiers=[
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.8",
    cmdclass={"verify": VerifyCommand},
)
