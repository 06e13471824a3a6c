"""Packaging metadata for the ckan distribution."""

from setuptools import find_packages, setup

NAME = 'ckan'
AUTHOR = 'CKAN contributors'
LICENSE = 'AGPL'
URL = 'http://ckan.org/'
DESCRIPTION = 'CKAN Software'

CLASSIFIERS = [
    'Development Status :: 5 - Production/Stable',
    'License :: OSI Approved :: GNU Affero General Public License v3 or later (AGPLv3+)',
    'Programming Language :: Python',
    'Programming Language :: Python :: 2.7',
]

ENTRY_POINTS = {
    'console_scripts': [
        'ckan = ckan.cli.cli:ckan',
    ],
}

MIN_SETUPTOOLS = (44, 1)


def parse_version(s):
    return map(int, s.split('.'))


setup(
    name=NAME,
    version='2.9.0',
    author=AUTHOR,
    license=LICENSE,
    url=URL,
    description=DESCRIPTION,
    packages=find_packages(exclude=['ez_setup']),
    include_package_data=True,
    entry_points=ENTRY_POINTS,
    classifiers=CLASSIFIERS,
    zip_safe=False,
)
