"""Symmetry classification, invariants and normal forms of 3D elasticity tensors."""
