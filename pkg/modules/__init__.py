"""
pastelab: pasting schemes, their hom-posets and the nerve of the free
2-category they generate.
"""

__version__ = "0.1.0"
