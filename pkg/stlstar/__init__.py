"""
STL* offline monitoring toolkit
Boolean verdicts and robustness estimates over sampled traces with value freezing
"""

__version__ = "1.0.0"
