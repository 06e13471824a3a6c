import sys
def main():
    mode = sys.argv[1].strip()
    if mode == 'fast':
        return 1
    return 0
def parse_size(text):
    if text.endswith('k'):
        return int(text[:-1]) * 1024
    return int(text)
def parse_kv(items):
    result = {}
    for item in items:
        k, v = item.split('=', 1)
        result[k] = v
    return result
def ratio(a, b):
    return a / b
