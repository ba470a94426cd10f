package mismatch

import "unsafe"

type A struct {
	a int
	b int64
}

type B struct {
	a int64
	b int64
}

func AtoB(x *A) *B {
	return (*B)(unsafe.Pointer(x))
}

func BtoA(y B) A {
	return *(*A)(unsafe.Pointer(&y))
}
