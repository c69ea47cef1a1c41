"""q-Cartan matrices, normal forms and derived-equivalence invariants of
gentle and skewed-gentle algebras."""

__version__ = "0.1.0"
