"""
neutralldp unit tests
"""
