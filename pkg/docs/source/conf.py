# -*- coding: utf-8 -*-
#
# kernid documentation build configuration file.
import os

import guzzle_sphinx_theme


_ROOT_SOURCE = os.path.dirname(os.path.abspath(__file__))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.viewcode',
    'sphinx.ext.mathjax',
    'guzzle_sphinx_theme',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'kernid'
copyright = u'2020, kernid contributors'
author = u'kernid contributors'

version = u'0.1'
release = u'0.1.0'

language = None
exclude_patterns = []
pygments_style = 'sphinx'
todo_include_todos = False

html_theme_path = guzzle_sphinx_theme.html_theme_path()
html_theme = 'guzzle_sphinx_theme'
html_theme_options = {'project_nav_name': 'kernid'}
html_short_title = 'kernid'
html_static_path = []
htmlhelp_basename = 'kerniddoc'

primary_domain = 'py'
autodoc_member_order = 'bysource'
