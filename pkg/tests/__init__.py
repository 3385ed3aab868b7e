"""Tests suite for `liebi`."""
