package reflect

import "unsafe"

type Value struct {
	ptr unsafe.Pointer
}

func ValueOf(i any) Value { return Value{ptr: unsafe.Pointer(&i)} }
