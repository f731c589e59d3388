"""Instances, policies and instance files."""
