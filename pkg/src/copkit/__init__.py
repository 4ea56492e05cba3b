"""Machinery for programs that act on predicted input.

Modules: ``tm`` (Turing machines), ``distance`` (compression distance
oracles), ``qim`` (quasi-intuitive acceptance), ``predict`` (predictors
and indicator sequences), ``sim`` (delayed-perception ball game),
``dsl`` (agent language) and ``cli``.
"""

__version__ = "0.1.0"
