"""Open-access status reconciliation of bibliographic records.

Joins publication records with Crossref licence metadata, Unpaywall flags and
Gold-OA journal directories, classifies each publication per journal issue and
reports where the sources disagree.
"""

__version__ = "0.1.0"
