"""Exact jet-space diffeomorphism/gauge actions, Koszul-Tate complexes and
abelian-charge bookkeeping for observer-dependent lowest-energy representations."""

__version__ = "0.1.0"
