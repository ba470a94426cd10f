package dotimport

import . "unsafe"

func Addr(x *int) Pointer {
	p := Pointer(x)
	_ = Alignof(*x)
	return p
}
