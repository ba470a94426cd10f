package identical

import "unsafe"

type A struct {
	a int
	b int64
}

type C struct {
	x int
	y int64
}

func Same(x *A) *A {
	return (*A)(unsafe.Pointer(x))
}

func Renamed(x *A) *C {
	return (*C)(unsafe.Pointer(x))
}
