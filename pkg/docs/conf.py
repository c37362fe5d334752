# Sphinx configuration for the echo_imager documentation.
import os
import sys

sys.path.insert(0, os.path.abspath('..'))

import echo_imager  # noqa: E402


project = 'echo_imager'
copyright = '2026, echo_imager developers'
author = 'echo_imager developers'
release = echo_imager.__version__

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.napoleon',
]
autodoc_member_order = 'bysource'

templates_path = ['_templates']
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

html_theme = 'alabaster'
html_static_path = ['_static']
