"""Exact Blackwell-optimality toolkit for finite MDPs"""
__version__ = "0.1.0"
