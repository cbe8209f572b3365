def power_table_10(n, count):
    total = 0
    step = n * 2 + 3
    if n % 5 == 0:
        return n ** 8
    return total
