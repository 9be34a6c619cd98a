from setuptools import find_packages, setup

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

# Core dependencies - numerics plus config/report serialization
install_requires = [
    "numpy>=1.22.0",
    "scipy>=1.8.0",
    "dataclasses-json>=0.6.0",
    "typing-extensions>=4.7.0; python_version<'3.10'",
]

setup(
    name="py-mahler-kernels",
    version="1.0.0",
    author="Argo Nickerson",
    author_email="argo@envopen.org",
    description="Kernels, correlation functions and scaling limits of the reciprocal Mahler ensembles",
    long_description=long_description,
    long_description_content_type="text/markdown",
    license="LGPL-2.1",
    url="https://github.com/envopentech/py-mahler-kernels",
    project_urls={
        "Homepage": "https://github.com/envopentech/py-mahler-kernels",
        "Repository": "https://github.com/envopentech/py-mahler-kernels.git",
        "Issues": "https://github.com/envopentech/py-mahler-kernels/issues",
        "Changelog": "https://github.com/envopentech/py-mahler-kernels/blob/main/CHANGELOG.md",
    },
    packages=find_packages(include=["mahler_kernels", "mahler_kernels.*"]),
    include_package_data=True,
    keywords=[
        "random-polynomials",
        "mahler-measure",
        "point-processes",
        "determinantal",
        "pfaffian",
        "skew-orthogonal-polynomials",
        "scaling-limits",
        "monte-carlo",
    ],
    classifiers=[
        "Development Status :: 5 - Production/Stable",
        "Intended Audience :: Science/Research",
        "Intended Audience :: Developers",
        "License :: OSI Approved :: GNU Lesser General Public License v2 (LGPLv2)",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Software Development :: Libraries :: Python Modules",
        "Natural Language :: English",
    ],
    python_requires=">=3.9",
    install_requires=install_requires,
    extras_require={
        "dev": [
            "pytest>=7.0.0",
            "pytest-cov>=4.0.0",
            "black>=23.0.0",
            "isort>=5.12.0",
            "flake8>=6.0.0",
            "mypy>=1.5.0",
            "pre-commit>=3.0.0",
        ],
        "docs": [
            "sphinx>=7.0.0",
            "sphinx-rtd-theme>=1.3.0",
            "myst-parser>=2.0.0",
        ],
        "test": [
            "pytest>=7.0.0",
            "pytest-cov>=4.0.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "mahler-kernels=mahler_kernels.cli.main:main",
        ],
    },
)
