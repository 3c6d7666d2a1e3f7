#define USART_DR_OFFSET 0x04
