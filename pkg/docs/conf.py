# Sphinx configuration for the cyclelab documentation.

import os
import sys

sys.path.insert(0, os.path.abspath(".."))

project = u'cyclelab'
copyright = u'2026, the cyclelab developers'
author = u'the cyclelab developers'
version = u'0.1.0'
release = version

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.autosummary',
]
autodoc_member_order = 'bysource'

templates_path = ['_templates']
source_suffix = ['.rst']
master_doc = 'index'
exclude_patterns = [u'_build']

html_static_path = []
htmlhelp_basename = 'cyclelabdoc'

man_pages = [
    (master_doc, 'cyclelab', u'cyclelab Documentation', [author], 1)
]
