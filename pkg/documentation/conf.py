# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Configuration file for the Sphinx documentation builder."""

import os
import sys

sys.path.insert(0, os.path.abspath("../src"))

project = "orbicoh"
copyright = "2024 orbicoh contributors"
author = "orbicoh contributors"

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosectionlabel",
    "sphinx.ext.mathjax",
]
autodoc_member_order = "bysource"
autodoc_typehints = "description"
autosectionlabel_prefix_document = True

root_doc = "index"
templates_path = ["_templates"]
exclude_patterns = ["_build", "samples", "Thumbs.db", ".DS_Store"]

html_theme = "sphinx_rtd_theme"
