"""Unit tests for blackwell-mdp"""
