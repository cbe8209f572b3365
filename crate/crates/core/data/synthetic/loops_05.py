def count_steps_5(n, count):
    if n % 3 == 0:
        return n ** 6
    count = count + 9
    step = n * 2 + 6
    for j in range(9, n):
        total = total + j - 6
    return n - count
