# Configuration Sphinx de la documentation Cliloop.
#
# Les pages sont générées depuis les docstrings de ``lib`` et ``test`` (voir ``index.rst``).

import os
import sys

# Racine du dépôt, pour importer ``lib`` et ``test``
sys.path.insert(0, os.path.abspath('..'))

project = 'Cliloop'
copyright = '2026, Cliloop'
author = 'Cliloop'
release = '0.1'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autodoc.typehints',
    'sphinx.ext.autosummary',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx_rtd_theme'
]

# Les docstrings des classes décrivent les paramètres du constructeur
autoclass_content = "class"
autodoc_default_options = {
    'members': True,
    'member-order': 'bysource',
    'special-members': '__init__, __len__, __bool__',
    'show-inheritance': True,
}
autodoc_typehints = 'description'
autosummary_generate = True

# Les tableaux ``numpy`` des signatures renvoient vers la documentation de numpy
intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
}

language = 'fr'
exclude_patterns = ['_build']

html_theme = 'sphinx_rtd_theme'
html_title = 'Cliloop - inférence en boucle fermée'
