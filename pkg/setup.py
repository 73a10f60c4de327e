# -*- coding: utf-8 -*-
from setuptools import setup, find_packages

INSTALL_REQUIRES = [
    'jsonschema>=3.0',
    'numpy>=1.20',
    'plaster_pastedeploy>=0.5',
    'pyramid>=1.9',
    'scipy>=1.5',
]

TESTING_EXTRAS = ['mock', 'pytest>=2.5', 'pytest-cov', 'factory-boy']

setup(
    name='peakseg',
    version='0.1.0',
    description='Weakly supervised instance segmentation with class peak '
                'responses.',
    long_description='\n\n'.join([
        open('README.rst', 'rt').read(),
        open('CHANGES.txt', 'rt').read(),
    ]),
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Image Recognition',
    ],
    keywords='segmentation weak-supervision peak-response-maps',
    license='Simplified (2-Clause) BSD License',
    packages=find_packages(exclude=['*.test']),
    include_package_data=True,
    zip_safe=False,
    python_requires='>=3.6',
    install_requires=INSTALL_REQUIRES,
    extras_require={
        'testing': TESTING_EXTRAS,
    },
    tests_require=TESTING_EXTRAS,
    entry_points={
        'console_scripts': [
            'peakseg=peakseg.script:main',
        ],
    },
)
