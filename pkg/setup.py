"""Скрипт встановлення для quantum_bath_brownian."""

from setuptools import find_packages, setup


setup(
    name="quantum_bath_brownian",
    version="0.1.0",
    packages=find_packages(exclude=["examples", "examples.*"]),
    py_modules=["run"],
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.11",
        "jsonschema>=4.0",
        "python-dotenv>=1.0.0",
    ],
    extras_require={"test": ["pytest>=7.0", "pytest-cov>=4.0"]},
    entry_points={
        "console_scripts": [
            "qbath=run:main",
        ],
    },
    description="Броунівський рух класичної частинки у квантовому термостаті: шум, Ланжевен, Крамерс, Смолуховський",
    keywords="brownian motion, quantum bath, langevin, fokker-planck, smoluchowski",
    python_requires=">=3.9",
)
