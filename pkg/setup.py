from setuptools import find_packages, setup

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="km-forge",
    version="1.0.0",
    description="Finite Heyting algebras, least dense elements and the one-step KM enrichment",
    long_description=long_description,
    long_description_content_type="text/markdown",
    license='MIT',
    packages=find_packages(exclude=["tests"]),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.8",
    install_requires=[
        "click",
        "networkx",
        "numpy",
        "pydantic>=2.6",
        "pydot",
        "StrEnum",
    ],
    extras_require={
        "test": ["pytest"],
    },
    entry_points={
        "console_scripts": ["km-forge=km_forge.cli:run"],
    },
    keywords='heyting-algebra intuitionistic-logic km-algebra lattice',
    include_package_data=True,
)
