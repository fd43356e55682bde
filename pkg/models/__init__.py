"""
Data types for clauses, prover runs, derivation graphs, tasks and grades
"""
