from setuptools import setup

setup(
    name='qgenocchi',
    version='0.1.0',
    packages=['qgenocchi'],
    package_data={'qgenocchi': ['data/*.json', 'data/*.csv']},
    python_requires='>=3.10',
    install_requires=['dill',
                      'pandas',
                      'psutil',
                      'sympy'],
    entry_points={'console_scripts': ['qgenocchi=qgenocchi.cli:main']}
)
