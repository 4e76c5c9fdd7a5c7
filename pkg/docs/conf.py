# -*- coding: utf-8 -*-
# Licensed under a 3-clause BSD style license - see LICENSE.rst
#
# Astropy documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing dir.
#
# All configuration values have a default. Some values are defined in
# the global Astropy configuration which is loaded here before anything else.
# See astropy.sphinx.conf for which values are set there.

import datetime
import os
import sys

sys.path.insert(0, os.path.abspath(".."))
import tomllib


try:
    from sphinx_astropy.conf.v2 import *  # noqa
except ImportError:
    print("ERROR: the documentation requires the sphinx-astropy package to be installed")
    sys.exit(1)


# Get configuration information from pyproject.toml

with open(os.path.join(os.path.dirname(__file__), "..", "pyproject.toml"), "rb") as f:
    project_metadata = tomllib.load(f)["project"]

# -- General configuration ----------------------------------------------------

# By default, highlight as Python 3.
highlight_language = "python3"


# --- Additional/local Sphinx extensions ---
# Add only those extensions that are NOT already included in sphinx_astropy.conf.v2

try:
    extensions  # noqa: F405
except NameError:
    extensions = [
        "sphinx.ext.autodoc",
        "sphinx.ext.intersphinx",
        "sphinx.ext.viewcode",
        "sphinx.ext.autosummary",
        "sphinx.ext.graphviz",  # DOT exports of balls and diagrams
        "sphinx_automodapi.automodapi",
        "sphinx_automodapi.smart_resolver",
        "pytest_doctestplus.sphinx.doctestplus",
    ]

# Remove 'numpydoc' if present (we want to use 'napoleon' instead)
if "numpydoc" in extensions:
    extensions.remove("numpydoc")

additional_extensions = [
    "sphinx.ext.napoleon",
    "sphinx.ext.mathjax",
    "sphinx.ext.graphviz",
    "sphinx_design",
    "sphinx_automodapi.automodapi",
]
for ext in additional_extensions:
    if ext not in extensions:
        extensions.append(ext)


# List of patterns, relative to source directory, that match files and
# directories to ignore when looking for source files.
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]
exclude_patterns.append("_templates")  # noqa: F405

# -- Project information ------------------------------------------------------

# This does not *have* to match the package name, but typically does
project = project_metadata["name"]
author = "The bandlab developers"
copyright = "{0}, {1}".format(datetime.datetime.now().year, author)


# -- Options for HTML output --------------------------------------------------

# The name for this set of Sphinx documents.  If None, it defaults to
# "<project> v<release> documentation".
html_title = "bandlab"

# Output file base name for HTML help builder.
htmlhelp_basename = project + "doc"

# Prefixes that are ignored for sorting the Python module index
modindex_common_prefix = ["bandlab."]

html_context = {
    "default_mode": "light",
    "doc_path": "docs",
}

# -- Options for LaTeX output -------------------------------------------------
latex_documents = [("index", project + ".tex", project + " Documentation", author, "manual")]

# -- Options for manual page output -------------------------------------------

# One entry per manual page. List of tuples
# (source start file, name, description, authors, manual section).
man_pages = [("index", project.lower(), project + " Documentation", [author], 1)]


# -- Options for linkcheck output -------------------------------------------
linkcheck_retry = 5
linkcheck_timeout = 180
linkcheck_anchors = False


# -- Options for intersphinx --------------------------------------------------
intersphinx_mapping.update(  # noqa: F405
    {
        "astropy": ("https://docs.astropy.org/en/stable/", None),
        "networkx": ("https://networkx.org/documentation/stable/", None),
        "pandas": ("https://pandas.pydata.org/docs/", None),
        "joblib": ("https://joblib.readthedocs.io/en/stable/", None),
        "pip": ("https://pip.pypa.io/en/stable/", None),
    }
)

# -- API documentation options -----------------------------------------------
autodoc_typehints = "description"



# -- Graphviz ------------------------------------------------------------------
graphviz_output_format = "svg"
