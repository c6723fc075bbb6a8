"""
Resource-inequality language: parser, evaluator and composition rules.
"""
