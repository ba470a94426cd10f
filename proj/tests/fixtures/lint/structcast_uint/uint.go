package uintcast

import "unsafe"

type U struct {
	n uint
}

type P struct {
	n uintptr
}

func UtoP(u *U) *P {
	return (*P)(unsafe.Pointer(u))
}

func PtoU(p *P) *U {
	return (*U)(unsafe.Pointer(p))
}
