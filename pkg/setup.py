from setuptools import setup, find_packages

with open('README.md', 'r', encoding='utf-8') as f:
    long_description = f.read()

setup(
    name='l1-impute',
    version='0.1.0',
    description='Missing-value imputation on Z_N by L1 Fourier minimization, with recovery diagnostics',
    long_description=long_description,
    long_description_content_type='text/markdown',
    packages=find_packages(include=['l1impute', 'l1impute.*', 'l1impute_tools', 'l1impute_tools.*']),
    package_data={'l1impute': ['config/*.yaml']},
    python_requires='>=3.9',
    install_requires=[
        'numpy>=1.22',
        'pandas>=1.5',
        'pyyaml>=6.0',
        'requests>=2.31.0',
    ],
    extras_require={
        'test': ['pytest>=7.0', 'scipy>=1.8'],
    },
    entry_points={
        'console_scripts': ['l1impute=l1impute_tools.cli:main'],
    },
)
