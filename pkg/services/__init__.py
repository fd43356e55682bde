"""
Pipeline services: parsing, proving, graph mining, generation and grading
"""
