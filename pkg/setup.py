#!/usr/bin/env python

"""chaocrypt setuptools packaging."""


from setuptools import setup


setup()
