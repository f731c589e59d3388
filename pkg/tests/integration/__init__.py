"""Integration tests for blackwell-mdp"""
