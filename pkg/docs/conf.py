import os
import sys

sys.path.insert(0, os.path.abspath(".."))

project = "Erasure-Channel Age of Information"
html_title = "Erasure-Channel Age of Information Documentation"
extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.napoleon",
]
