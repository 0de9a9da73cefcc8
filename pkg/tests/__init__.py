"""Test package for sun-expm."""
