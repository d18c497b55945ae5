import os

from setuptools import setup


current_directory = os.path.abspath(os.path.dirname(__file__))
with open(os.path.join(current_directory, 'README.rst')) as f:
    long_description = f.read()

setup(
    name='cyclelab',
    packages=[
        "cyclelab"
    ],
    package_data={
        "cyclelab": ["gold/*.json"],
    },
    version='0.1.0',
    description='Exact focal values, Melnikov functions and numerical limit cycle checks for Kukles systems',
    zip_safe=False,
    python_requires=">=3.8",
    install_requires=[
        "astor",
        "sympy>=1.9",
        "numpy",
        "scipy>=1.4",
        "matplotlib",
    ],
    extras_require={
        "test": ["pytest", "hypothesis"],
    },
    entry_points={
        "console_scripts": ["cyclelab=cyclelab.cli:main"],
    },
    long_description=long_description,
    long_description_content_type='text/x-rst',
)
