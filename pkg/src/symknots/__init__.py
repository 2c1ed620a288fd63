"""Dihedrally symmetric closed curves, bending and tangent-point energies, symmetric flows."""
