"""setup.py file for simploscore"""

from setuptools import setup


setup(
    name="simploscore",
    version="0.0.1",
    description="Topology and curvature of musical scores as simplicial complexes",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    license="MIT",
    keywords="midi music topology simplicial complex betti euler forman curvature",
    classifiers=[
        "License :: OSI Approved :: MIT License",
        "Topic :: Multimedia :: Sound/Audio :: MIDI",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Development Status :: 3 - Alpha",
        "Framework :: Twisted",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        ],
    python_requires=">=3.8",
    packages=[
        "simploscore",
        "simploscore.cli",
        "simploscore.tests",
        ],
    install_requires=[
        "Twisted",
        "zope.interface",
        "numpy",
        "scipy",
        "networkx",
        "sympy",
        "mido",
        "matplotlib",
        "tomli; python_version < '3.11'",
        ],
    entry_points={
        "console_scripts": [
            "simploscore = simploscore.cli:main",
            ],
        },
    )
