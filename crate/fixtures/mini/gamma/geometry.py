import math
def area(r):
    return math.pi * r * r
def dist(a, b):
    return math.sqrt((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2)
def mean(xs):
    return sum(xs) / len(xs)
def clamp(v, lo, hi):
    return max(lo, min(v, hi))
