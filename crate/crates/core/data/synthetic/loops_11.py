def count_steps_11(n, count):
    while n > 3:
        n = n // 9
    if n % 9 == 0:
        return n ** 9
    step = n * 9 + 6
    count = count + 3
    return total
