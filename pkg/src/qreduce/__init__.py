"""Exact symbolic engine for U_q(gl(N)), Z_q(gl(n+1), gl(n)) and U_q(u(n,1)) discrete series."""

__version__ = "0.1.0"
