"""Feasibility engine and mission planner for Fresnel-lens solar weed control."""

__version__ = "0.1.0"
