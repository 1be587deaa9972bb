"""UABS: continual meta-RL for an aerial base station.

Discrete-time packet-collection simulator plus conventional, transfer and
CoMPS trainers, and the experiment harness around them.
"""

APPNAME = "UABS-CoMPS"
PYPI_NAME = "uabs-comps"
__version__ = "0.1.0"
