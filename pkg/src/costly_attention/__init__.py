"""Persuasion of a receiver who pays for attention: solvers, checks and brute-force oracles."""
