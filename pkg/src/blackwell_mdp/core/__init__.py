"""Exact polynomial, root isolation and Blackwell analysis core."""
