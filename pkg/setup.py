#!/usr/bin/env python
from setuptools import setup, find_packages


with open('README.rst') as readme_file:
    README = readme_file.read()


install_requires = [
    'click>=7.0,<9.0',
    'attrs>=19.3.0',
    'pyyaml>=5.3.1',
    'numpy>=1.17.0',
    'scipy>=1.7.0',
]

setup(
    name='kernid',
    version='0.1.0',
    description="Identifiability checks for mixed-kernel Gaussian "
                "process regression",
    long_description=README,
    packages=find_packages(exclude=['tests', 'tests.*']),
    install_requires=install_requires,
    python_requires='>=3.6',
    license="Apache License 2.0",
    include_package_data=True,
    zip_safe=False,
    keywords='gaussian-process kernel identifiability',
    entry_points={
        'console_scripts': [
            'kernid = kernid.cli:main',
        ]
    },
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: Apache Software License',
        'Natural Language :: English',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.6',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
)
