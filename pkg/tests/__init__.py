"""
Test suite for arithdyn.
"""
