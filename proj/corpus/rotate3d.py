def rotate_z(x, y, z, cos_a, sin_a):
    rx = x * cos_a - y * sin_a
    ry = x * sin_a + y * cos_a
    rz = z * 1.0
    return [rx, ry, rz]
