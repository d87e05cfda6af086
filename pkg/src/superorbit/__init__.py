"""Exact supercommutative algebra, coadjoint orbits of supergroups and their quantization."""
