"""explaineo: question-driven explanations for rule-based decision models.

A decision-model DSL, a tracing rule engine, property-graph projections,
verification checks, a ten-question explanation engine, renderers (text,
tables, DOT, openCypher), and a CLI + HTTP service on top.
"""

__version__ = "0.1.0"
