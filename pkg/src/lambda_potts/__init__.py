"""Ground states and translation-invariant Gibbs measures of the lambda model
with competing Potts interactions on the Cayley tree of order k."""

__version__ = "0.1.0"
