#!/usr/bin/env python3
"""Recompute rank summaries, pairwise counts and Wilcoxon tests from the
shipped reference result tables (D=30/50/100) and print them next to the
reported values."""

from hmsopt.harness import replay_fixtures

for fixture in ("D30", "D50", "D100"):
    print(replay_fixtures(fixture).render())
    print()
