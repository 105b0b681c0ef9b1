"""
Independent verification engines for the pricing kernel.
"""
