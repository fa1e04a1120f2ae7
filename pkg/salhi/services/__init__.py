"""
Services: gain optimization, sweeps, figure presets and self-verification
"""
