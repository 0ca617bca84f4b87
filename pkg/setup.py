from setuptools import find_packages, setup

setup(
    name='periodlab',
    version='0.1.0',
    description='Period function analysis of conservative and Lienard centers',
    long_description=open('README.md').read(),
    long_description_content_type='text/markdown',
    license='LGPL-3.0',
    packages=find_packages(exclude=['tests']),
    python_requires='>=3.8',
    install_requires=[
        'numpy',
        'scipy',
        'jsonschema>=4',
    ],
    extras_require={
        'tests': ['pytest'],
    },
    entry_points={
        'console_scripts': ['periodlab=periodlab.cli:main'],
    },
)
