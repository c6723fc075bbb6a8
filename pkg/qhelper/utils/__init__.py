"""Shared utilities: logging, configuration, validation and atomic output"""
